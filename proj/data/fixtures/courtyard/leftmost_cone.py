def execute_command(image):
    cone_patches = ImagePatch(image).find('cone')
    cone_patches.sort(key=lambda x: x.horizontal_center)
    if len(cone_patches) == 0:
        return {'function': 'None', 'error': 'No cone found.'}
    cone = cone_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (cone.horizontal_center, cone.vertical_center), 'box': [cone.left, cone.lower, cone.right, cone.upper]}
