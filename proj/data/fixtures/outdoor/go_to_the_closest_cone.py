def execute_command(image):
    image_patch = ImagePatch(image)
    cones = image_patch.find('cone')
    if len(cones) == 0:
        return {'function': 'None', 'error': 'No cone found.'}
    cones.sort(key=lambda c: c.compute_depth())
    cone = cones[0]
    return {'function': 'navigate_to_object', 'inputs': (cone.horizontal_center, cone.vertical_center), 'box': [cone.left, cone.lower, cone.right, cone.upper]}
