def execute_command(image):
    # something that puts out fires
    image_patch = ImagePatch(image)
    extinguishers = image_patch.find('extinguisher')
    if len(extinguishers) == 0:
        return {'function': 'None', 'error': 'Nothing to put out a fire with.'}
    target = extinguishers[0]
    return {'function': 'navigate_to_object', 'inputs': (target.horizontal_center, target.vertical_center), 'box': [target.left, target.lower, target.right, target.upper]}
