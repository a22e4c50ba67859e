def execute_command(image):
    image_patch = ImagePatch(image)
    cones = image_patch.find('cone')
    outlets = image_patch.find('outlet')
    if len(cones) == 0 or len(outlets) == 0:
        return {'function': 'None', 'error': 'Missing cone or outlet.'}
    outlets.sort(key=lambda o: distance(o, cones[0]))
    outlet = outlets[0]
    return {'function': 'navigate_to_object', 'inputs': (outlet.horizontal_center, outlet.vertical_center), 'box': [outlet.left, outlet.lower, outlet.right, outlet.upper]}
